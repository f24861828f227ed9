from django.contrib import admin
from django.urls import path

urlpatterns = [
    path("admin/", admin.site.urls),
]


admin.site.site_header = "Семантический поиск"
admin.site.index_title = "Эксперименты"  # default: "Site administration"
admin.site.site_title = "Семантический поиск"  # default: "Django site admin"
admin.site.site_url = None
